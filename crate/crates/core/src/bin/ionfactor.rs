// Copyright 2026 The ionfactor Authors
// SPDX-License-Identifier: Apache-2.0

fn main() {
    std::process::exit(ionfactor::cli::main(std::env::args_os()));
}
