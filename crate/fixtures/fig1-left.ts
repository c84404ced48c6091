group: C4
e -> C2
e -> C4
