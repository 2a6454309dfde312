"""Numerical services on even Hecke-Maass forms"""
