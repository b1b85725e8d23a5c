"""IRS hardware-impairment analysis toolkit"""

__version__ = "0.1.0"
__author__ = "IRS Analysis Team"
__description__ = "Closed-form, Monte Carlo and SDP analysis of an IRS-aided SISO link with hardware impairments"
