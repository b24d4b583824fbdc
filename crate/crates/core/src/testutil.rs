use proptest::test_runner::{Config, RngSeed};

/// Fixed-seed proptest configuration so every run samples the same cases.
pub fn pt(cases: u32) -> Config {
    Config { cases, rng_seed: RngSeed::Fixed(0x7153_6b31), failure_persistence: None, ..Config::default() }
}
