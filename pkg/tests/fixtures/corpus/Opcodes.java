class Opcodes {
  int[] NO_OF_OPERANDS;
  String[] OPCODE_NAMES;
  int[] CONSUME_STACK;
  int[] PRODUCE_STACK;

  int getNoOfOperands(final int index) {
    return NO_OF_OPERANDS[index];
  }

  String getOpcodeName(final int opcode) {
    return OPCODE_NAMES[opcode];
  }

  int getConsumeStack(final int opcode) {
    return CONSUME_STACK[opcode];
  }

  int getProduceStack(final int opcode) {
    return PRODUCE_STACK[opcode];
  }

  int stackDelta(final int opcode) {
    return PRODUCE_STACK[opcode] - CONSUME_STACK[opcode];
  }
}
