// Copyright 2026 The ctqsim Developers
// SPDX-License-Identifier: Apache-2.0

fn main() {
    let code = ctqsim::cli::main_with_args(std::env::args_os(), &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
