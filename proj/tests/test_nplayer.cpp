#include <doctest.h>

TEST_SUITE("nplayer") {}
