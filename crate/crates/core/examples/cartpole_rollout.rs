// One CartPole episode from pixels: random actions until the pole falls.

use std::error::Error;

use pixgym::rng::SplitMix64;
use pixgym::{make_env, Seed};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let mut env = make_env("cartpole")?;
    let obs = env.reset(Seed(5))?;
    println!("reset: {} frames of {}x{}", obs.depth(), obs.width(), obs.height());

    let mut rng = SplitMix64::new(5);
    let mut total = 0.0;
    loop {
        let action = rng.below(2) as i64;
        let r = env.step(action)?;
        total += r.reward;
        if r.done {
            println!(
                "episode over after {} steps: {:?}, return {total}",
                r.step_index, r.reason
            );
            break;
        }
    }
    // Stepping a finished episode is an error until the next reset.
    assert!(env.step(0).is_err());
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
