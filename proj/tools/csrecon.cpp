#include <cstdio>

int main() {
  std::puts("csrecon: cli under construction");
  return 1;
}
