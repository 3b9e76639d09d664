"""Provides Utilities for all the other packages in the project"""
