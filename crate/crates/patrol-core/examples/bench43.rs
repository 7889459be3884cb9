use patrol_core::fence::{build_43_schedule, verify_fence_coverage, FenceConstructionParams};
use std::time::Instant;

fn main() {
    let t0 = Instant::now();
    let s = build_43_schedule(FenceConstructionParams::new(10, 200));
    println!("build: {:?}, agents: {}", t0.elapsed(), s.agents().len());
    let t1 = Instant::now();
    let v = verify_fence_coverage(&s);
    println!("verify: {:?}, covered: {}", t1.elapsed(), v.is_covered());
}
