// Drives an environment over TCP with the JSON-lines protocol, the way an
// out-of-process trainer would.

use std::error::Error;
use std::net::TcpListener;
use std::thread;

use pixgym::client::WireClient;
use pixgym::envs::EnvConfig;
use pixgym::server::serve_listener;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let listener = TcpListener::bind("127.0.0.1:0")?;
    let addr = listener.local_addr()?;
    thread::spawn(move || serve_listener(listener, EnvConfig::default()));

    let mut client = WireClient::connect(addr)?;
    let (spec, actions) = client.hello("hover2d", Some(9))?;
    println!(
        "connected to {addr}: obs {}x{}x{}, {} actions",
        spec.height, spec.width, spec.depth, actions.n
    );

    let first = client.reset(None)?;
    println!("reset: {} bytes", first.obs.len());
    for action in [3, 3, 0, 1] {
        let o = client.step(action)?;
        println!("step {}: action {action}, reward {}, {:?}", o.step, o.reward, o.reason);
    }

    // Protocol errors come back in-band; the connection stays usable.
    match client.step(7) {
        Err(e) => println!("bad action rejected: {e}"),
        Ok(_) => unreachable!("action 7 is out of range"),
    }
    client.close()?;
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
