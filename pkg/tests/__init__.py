"""
MapForge test suite
"""
