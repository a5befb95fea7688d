// Throughput under a random policy, with render time split out.

use std::error::Error;

use pixgym::envs::EnvConfig;
use pixgym::runner::bench;
use pixgym::ENV_NAMES;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for name in ENV_NAMES {
        let r = bench(name, 100, 0, &EnvConfig::default())?;
        println!(
            "{name:9} {:7.1} samples/s  render mean {:.2} ms  p95 {:.2} ms  overhead {:.3} ms",
            r.samples_per_second,
            r.render_time_mean_s * 1e3,
            r.render_time_p95_s * 1e3,
            r.overhead_mean_s * 1e3
        );
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
