group: C4
// only the long arrow: not closed under restriction to C2
e -> C4
