group: C4
e -> C2
C2 -> C4
