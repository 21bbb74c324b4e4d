// Acceptance suite: one pass/fail line per criterion. Placeholder main while
// the library is under construction.
#include <cstdio>

int main() {
  std::printf("acceptance suite not yet implemented\n");
  return 1;
}
