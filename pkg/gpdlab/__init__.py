"""
Groupoid Lab Package

This package builds, validates and transforms finite groupoids and partial
groupoid actions given as explicit tables.

Modules:
- config: Environment configuration and settings
- errors: Exception hierarchy shared by all modules
- core: Groupoid tables, axiom validation, functors and basic constructors
- closure: Completion of partial composition tables
- subgrp: Subgroupoid predicates, subset products and internal direct products
- prod: Direct and semidirect products
- pact: Partial groupoid actions, action and graph groupoids
- catequiv: Star-injective functors and the correspondence with strict actions
- glob: Universal globalization of strict partial actions
- formats: GPD / PACT / FUNC / AUT text formats
- corpus: Named fixtures and seeded random generators
- cli: Command-line interface
"""

__version__ = "0.1.0"
