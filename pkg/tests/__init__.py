"""Tests for copestop"""
