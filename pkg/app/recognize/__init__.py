"""Decision procedures for destabilization, exchange move and elementary flype"""
