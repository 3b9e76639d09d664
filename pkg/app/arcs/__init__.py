"""Arc presentations and the transitions between braids and arc presentations"""
