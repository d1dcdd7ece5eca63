#include <doctest.h>

TEST_SUITE("exhaustible") {}
