#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <string>

// Captured so CLI tests can locate sibling binaries next to the test runner.
std::string g_test_argv0;

int main(int argc, char** argv) {
  g_test_argv0 = argv[0];
  doctest::Context ctx;
  ctx.applyCommandLine(argc, argv);
  return ctx.run();
}
