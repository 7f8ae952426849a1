"""
Urban perception extraction: learns a dictionary of perception qualifiers from place reviews
and maps geolocated documents onto perception clusters, strength reports and comparisons.
"""
__version__ = "0.1.0"
