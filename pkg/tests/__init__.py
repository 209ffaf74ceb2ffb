"""jitterlab test suite"""
