#include "sdc/optimize.hpp"
int main() { return 0; }
