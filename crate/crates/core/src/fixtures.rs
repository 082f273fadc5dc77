//! The feeding-pace framework: six arguments `a`..`f` bearing on two
//! decisions, `D1` (feed slowly) and `D2` (feed quickly).

use crate::model::BipolarFramework;

/// Id of the "slow" decision argument.
pub const SLOW: &str = "D1";
/// Id of the "fast" decision argument.
pub const FAST: &str = "D2";

pub fn feeding_pace() -> BipolarFramework {
    BipolarFramework::builder()
        .arguments(["a", "b", "c", "d", "e", "f", SLOW, FAST])
        .attack("a", SLOW)
        .attack("e", "b")
        .attack("f", FAST)
        .support("c", "b")
        .support("b", SLOW)
        .support("e", "d")
        .support("d", FAST)
        .decision(SLOW)
        .decision(FAST)
        .build()
        .expect("fixture is well formed")
}
