// Copyright 2026 The ionfactor Authors
// SPDX-License-Identifier: Apache-2.0

//! Checks the tabulated Fredkin and four-target CNOT sequences.

use ionfactor::cli::verify_named_sequence;

fn main() -> ionfactor::Result<()> {
    for name in ["fredkin", "four-target-cnot"] {
        let r = verify_named_sequence(name)?;
        println!("{}", serde_json::to_string_pretty(&r)?);
    }
    Ok(())
}
