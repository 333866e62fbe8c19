"""Opinion mining over brand and celebrity tweets for endorsement decisions."""

__version__ = "0.1.0"
