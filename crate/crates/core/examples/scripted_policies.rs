// Runs each environment's hand-written controller for a few seeds.

use std::error::Error;

use pixgym::{make_env, Seed, ENV_NAMES};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for name in ENV_NAMES {
        let mut env = make_env(name)?;
        for seed in 0..3 {
            env.reset(Seed(seed))?;
            let mut total = 0.0;
            let last = loop {
                let r = env.step(env.scripted_action() as i64)?;
                total += r.reward;
                if r.done {
                    break r;
                }
            };
            println!(
                "{name:9} seed {seed}: {:?} after {} steps, return {total}",
                last.reason, last.step_index
            );
        }
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
