"""Affine VW supercategory: exact normal forms, functor images and centre computations."""
