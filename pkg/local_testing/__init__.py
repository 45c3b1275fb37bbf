"""Local acceptance runner for pathlink scenarios"""
