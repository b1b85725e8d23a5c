"""Physical layer: scenario constants, channels and hardware impairments"""
