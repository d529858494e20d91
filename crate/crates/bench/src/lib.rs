//! Fixture generators shared by the benchmarks.

use cyclidx::discrete::SymplecticSystem;
use cyclidx::lagrangian::random_frame;
use cyclidx::verify::{random_chain, ChainKind};
use cyclidx::{FrameChain, LagrangianFrame};

pub fn pair(n: usize, seed: u64) -> (LagrangianFrame, LagrangianFrame) {
    (random_frame(n, seed), random_frame(n, seed ^ 0xA5))
}

pub fn chain(n: usize, m: usize, seed: u64) -> FrameChain {
    random_chain(n, m, seed, ChainKind::Generic)
}

pub fn degenerate_chain(n: usize, m: usize, seed: u64) -> FrameChain {
    random_chain(n, m, seed, ChainKind::Repeated)
}

pub fn system(n: usize, big_n: usize, seed: u64) -> SymplecticSystem {
    SymplecticSystem::random(n, big_n, seed, 6, false)
}
