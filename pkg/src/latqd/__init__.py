"""latqd: weight enumerators and trigonometric degree of rank-1 lattice rules."""
