"""Recognition of frontal map-germs from their jets."""

__version__ = "0.1.0"
