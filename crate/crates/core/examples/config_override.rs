// Environment parameters can be overridden from TOML.

use std::error::Error;

use pixgym::envs::EnvConfig;
use pixgym::Seed;

const CONFIG: &str = r#"
[observation]
height = 64
width = 64
depth = 2

[goalie]
max_steps = 5
"#;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let cfg = EnvConfig::from_toml_str(CONFIG)?;
    let mut env = cfg.make("goalie")?;
    let obs = env.reset(Seed(0))?;
    println!("observation {}x{}x{}", obs.height(), obs.width(), obs.depth());
    assert_eq!(obs.to_bytes().len(), 64 * 64 * 2);

    let mut steps = 0;
    while !env.step(0)?.done {
        steps += 1;
    }
    println!("episode capped after {} steps", steps + 1);

    // Unknown keys are rejected rather than silently ignored.
    assert!(EnvConfig::from_toml_str("[goalie]\nmax_stepz = 5\n").is_err());
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
