#include <iostream>

int main() {
    std::cerr << "cli not wired yet\n";
    return 1;
}
