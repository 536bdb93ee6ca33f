//! Shared setup for the solver benchmarks.

use hjnet_core::{presets, Grid, Network};

pub fn straight_arc_case(dx: f64) -> (Network, Grid) {
    let net = presets::test2();
    let grid = Grid::build(&net, dx).unwrap();
    (net, grid)
}

pub fn oscillatory_cost_case(dx: f64) -> (Network, Grid) {
    let net = presets::test4();
    let grid = Grid::build(&net, dx).unwrap();
    (net, grid)
}
