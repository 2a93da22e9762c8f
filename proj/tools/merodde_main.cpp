#include <iostream>

int main() {
  std::cout << "merodde CLI scaffold\n";
  return 0;
}
