"""Cyclic braid words in the Artin generators"""
