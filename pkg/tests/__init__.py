"""infoloss Tests"""
