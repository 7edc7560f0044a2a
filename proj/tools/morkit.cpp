// Copyright The morkit Authors.
// SPDX-License-Identifier: Apache-2.0

#include "morkit/harness/runner.hpp"

int main(int argc, char **argv) { return morkit::harness::cli_main(argc, argv); }
