"""qtopt: population-based search over JPEG quantisation tables.

Given an image and a target file size, any of 18 population-based
metaheuristics searches the 129-dimensional integer space of two 8x8
quantisation tables plus a quality factor, producing a standards-decodable
JPEG whose size tracks the target while PSNR is maximised.
"""

__version__ = "0.1.0"
