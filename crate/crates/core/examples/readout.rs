// Copyright 2026 The ionfactor Authors
// SPDX-License-Identifier: Apache-2.0

//! Threshold sweep of the photon-counting discriminator.

use ionfactor::runtime::ReadoutModel;

fn main() {
    println!("threshold  dark-error   bright-error");
    for threshold in 1..=8 {
        let m = ReadoutModel { threshold, ..ReadoutModel::default() };
        println!("{threshold:>9}  {:.3e}  {:.3e}", m.dark_error(), m.bright_error());
    }
}
