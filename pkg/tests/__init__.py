"""Tests package for Algebroid Lifts."""
