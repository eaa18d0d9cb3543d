"""
This module contains unit tests of class Engine.
"""
