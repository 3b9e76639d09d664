"""The monotonic simplification engine"""
