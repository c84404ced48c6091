group: A5
mode: classes
S3 -> A5
C3 -> A4
C2 -> C2xC2
C2 -> D5
e -> C2
e -> C5
C5 -> D5
