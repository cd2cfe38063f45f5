#include <cstdio>
int main() { std::printf("sighedge cli: pending\n"); return 0; }
