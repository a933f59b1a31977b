#include <cstdio>

int main() {
    std::puts("feqtool: not wired up yet");
    return 2;
}
