group: C2xC2
e -> C2#1
e -> C2#2
e -> C2#3
C2#2 -> C2xC2
