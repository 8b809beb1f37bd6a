#include <iostream>
int main() { std::cout << "pla: not yet wired\n"; return 2; }
