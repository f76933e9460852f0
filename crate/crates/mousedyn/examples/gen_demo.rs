//! Generate a small synthetic dataset so the pipeline can be tried
//! without any real capture data.
//!
//! Usage: cargo run --example gen_demo -- [dir] [seed]

use mousedyn::synth::{demo_users, write_synthetic_dataset};

fn main() {
    let mut args = std::env::args().skip(1);
    let root = args.next().unwrap_or_else(|| "demo_data".into());
    let seed: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(42);
    write_synthetic_dataset(std::path::Path::new(&root), &demo_users(40, 4), seed)
        .expect("demo dataset written");
    println!("wrote 2 users x 4 sessions x 40 actions to {root}/ (seed {seed})");
}
