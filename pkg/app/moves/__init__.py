"""Sheared arc presentations and the elementary moves acting on them"""
