"""Opcodes of the postfix interval program shared by both kernels."""

OP_X = 0
OP_Y = 1
OP_CONST = 2
OP_ADD = 3
OP_SUB = 4
OP_MUL = 5
OP_DIV = 6
OP_NEG = 7
OP_SQR = 8
OP_POWI = 9
OP_SIN = 10
OP_COS = 11
OP_EXP = 12
