// Acceptance suite: one pass/fail line per criterion. Exit code 0 iff all pass.
#include <cstdio>

int main() {
    std::printf("acceptance suite placeholder\n");
    return 0;
}
