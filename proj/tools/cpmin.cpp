#include "cpmin/cpmin.hpp"
int main() { return 0; }
