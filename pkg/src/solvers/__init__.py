"""Semidefinite solver and the phase optimization built on it"""
