// Copyright 2026 The tacsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "tacsim/scene/cli.hpp"

int main(int argc, char** argv) { return tacsim::scene::cli(argc, argv); }
