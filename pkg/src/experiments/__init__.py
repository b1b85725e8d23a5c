"""Experiment nodes: one class per figure plus the custom sweep"""
