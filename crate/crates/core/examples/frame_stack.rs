// The observation is the last four frames, oldest first, as a
// (height, width, depth) tensor.

use std::error::Error;

use pixgym::{make_env, stack_to_tensor, Seed};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let mut env = make_env("goalie")?;
    let reset_frame = env.reset(Seed(2))?.latest().clone();

    // Walk left a few times; each step pushes a new frame and drops the oldest.
    let mut obs = None;
    for _ in 0..3 {
        obs = Some(env.step(0)?.obs);
    }
    let obs = obs.expect("stepped");
    assert_eq!(obs.frame(0), &reset_frame);

    let tensor = stack_to_tensor(&obs);
    println!("tensor shape {:?}, dtype u8", tensor.shape());
    let (row, col) = (50, 50);
    let history: Vec<u8> = (0..4).map(|d| tensor[[row, col, d]]).collect();
    println!("pixel ({row}, {col}) over time, oldest first: {history:?}");

    let bytes = obs.to_bytes();
    assert_eq!(bytes.len(), 100 * 100 * 4);
    assert_eq!(
        bytes[(row * 100 + col) * 4 + 3],
        obs.latest().get(col as u32, row as u32)
    );
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
