//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.
//!
//! When `PIXGYM_DIGEST_CHILD` is set the binary instead prints rollout
//! digests and exits; the determinism check re-executes itself that way to
//! compare two independent processes.

use std::collections::BTreeMap;
use std::io::{BufRead, BufReader, Write};
use std::net::TcpListener;
use std::process::{Command, ExitCode, Stdio};
use std::thread;
use std::time::Instant;

use pixgym::client::WireClient;
use pixgym::env::Reason;
use pixgym::envs::cartpole::{cartpole_dynamics, CartPoleParams, CartPoleState};
use pixgym::envs::EnvConfig;
use pixgym::protocol::{Request, Response, Session};
use pixgym::rng::SplitMix64;
use pixgym::runner::bench;
use pixgym::server::serve_listener;
use pixgym::{make_env, stack_to_tensor, Seed, ENV_NAMES};
use serde::Deserialize;
use sha2::{Digest, Sha256};

const CHILD_VAR: &str = "PIXGYM_DIGEST_CHILD";
const ROLLOUT_SEED: u64 = 42;
const ROLLOUT_STEPS: usize = 60;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, detail: String) -> Check {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

// ---------------------------------------------------------------- contract

fn observation_contract() -> Check {
    for name in ENV_NAMES {
        let mut env = make_env(name).map_err(|e| e.to_string())?;
        let mut shapes = vec![stack_to_tensor(env.reset(Seed(1)).unwrap()).shape().to_vec()];
        let mut rng = SplitMix64::new(1);
        let n = env.action_space().n as u64;
        for _ in 0..20 {
            let r = env.step(rng.below(n) as i64).map_err(|e| e.to_string())?;
            let t = stack_to_tensor(&r.obs);
            if r.obs.to_bytes().len() != 40_000 {
                return Err(format!("{name}: {} bytes", r.obs.to_bytes().len()));
            }
            shapes.push(t.shape().to_vec());
            if r.done {
                break;
            }
        }
        if let Some(bad) = shapes.iter().find(|s| s.as_slice() != [100, 100, 4]) {
            return Err(format!("{name}: shape {bad:?}"));
        }
    }
    Ok("(100, 100, 4) u8 for every env".into())
}

// ------------------------------------------------------------- render time

fn render_time() -> Check {
    let mut parts = Vec::new();
    let mut ok = true;
    for name in ENV_NAMES {
        let r = bench(name, 1000, 0, &EnvConfig::default()).map_err(|e| e.to_string())?;
        ok &= r.render_time_mean_s < 0.03;
        if name == "cartpole" {
            ok &= r.samples_per_second > 33.0;
        }
        parts.push(format!(
            "{name} mean {:.2} ms, {:.0} samples/s",
            r.render_time_mean_s * 1e3,
            r.samples_per_second
        ));
    }
    ensure(ok, parts.join("; "))
}

// ---------------------------------------------------------------- cartpole

#[derive(Deserialize)]
struct Fixture {
    trajectories: Vec<Trajectory>,
}

#[derive(Deserialize)]
struct Trajectory {
    initial: [f64; 4],
    actions: Vec<usize>,
    states: Vec<[f64; 4]>,
}

fn cartpole_oracle() -> Check {
    let fx: Fixture =
        serde_json::from_str(include_str!("fixtures/cartpole_reference.json")).map_err(|e| e.to_string())?;
    let p = CartPoleParams::default();
    let mut worst = 0.0f64;
    let mut steps = 0;
    for tr in &fx.trajectories {
        let [x, xd, th, thd] = tr.initial;
        let mut s = CartPoleState::new(x, xd, th, thd);
        for (&a, want) in tr.actions.iter().zip(&tr.states) {
            s = cartpole_dynamics(&p, &s, a);
            steps += 1;
            for (g, w) in s.components().iter().zip(want) {
                worst = worst.max((g - w).abs());
            }
        }
    }
    ensure(
        fx.trajectories.len() == 50 && steps == 5000 && worst <= 1e-9,
        format!(
            "{} trajectories, {steps} steps, max deviation {worst:e}",
            fx.trajectories.len()
        ),
    )
}

// ----------------------------------------------------------------- rewards

fn reward_schedules() -> Check {
    let cfg = EnvConfig::default();
    let allowed: [(&str, &[f64], &[f64]); 3] = [
        ("cartpole", &[1.0], &[1.0]),
        ("hover2d", &[0.0], &[-20.0, 10.0, 20.0]),
        ("goalie", &[0.0], &[-10.0, 10.0]),
    ];
    let mut seen = BTreeMap::new();
    for (name, step_rewards, terminal_rewards) in allowed {
        for ep in 0..1000u64 {
            let mut d = cfg.dynamics(name).map_err(|e| e.to_string())?;
            d.reset(&mut SplitMix64::new(ep));
            let mut rng = SplitMix64::new(!ep);
            let n = d.action_space().n as u64;
            let mut terminals = 0;
            for t in 0..1000 {
                d.advance(rng.below(n) as usize);
                let j = d.judge();
                if j.reason.is_terminal() {
                    terminals += 1;
                    if !terminal_rewards.contains(&j.reward) {
                        return Err(format!("{name} ep {ep}: terminal reward {} ({:?})", j.reward, j.reason));
                    }
                    *seen.entry((name, j.reason.as_str(), j.reward.to_string())).or_insert(0) += 1;
                    break;
                }
                if !step_rewards.contains(&j.reward) {
                    return Err(format!("{name} ep {ep} step {t}: reward {}", j.reward));
                }
            }
            if terminals != 1 {
                return Err(format!("{name} ep {ep}: {terminals} terminal reasons"));
            }
        }
    }
    let summary: Vec<String> = seen.iter().map(|((n, r, w), c)| format!("{n}/{r}={w}x{c}")).collect();
    Ok(summary.join(" "))
}

// ------------------------------------------------------------- determinism

/// Digest of a seeded random rollout: every observation tensor and reward.
fn rollout_digest(name: &str) -> String {
    let mut env = make_env(name).unwrap();
    let mut h = Sha256::new();
    h.update(env.reset(Seed(ROLLOUT_SEED)).unwrap().to_bytes());
    let mut rng = SplitMix64::new(ROLLOUT_SEED);
    let n = env.action_space().n as u64;
    for _ in 0..ROLLOUT_STEPS {
        let r = env.step(rng.below(n) as i64).unwrap();
        h.update(r.obs.to_bytes());
        h.update(r.reward.to_le_bytes());
        if r.done {
            h.update(env.reset(Seed(ROLLOUT_SEED + 1)).unwrap().to_bytes());
        }
    }
    format!("{:x}", h.finalize())
}

fn reset_digest(name: &str) -> String {
    let mut env = make_env(name).unwrap();
    sha256_hex(env.reset(Seed(0)).unwrap().latest().pixels())
}

fn digest_report() -> String {
    ENV_NAMES
        .iter()
        .map(|n| format!("{n} {} {}\n", reset_digest(n), rollout_digest(n)))
        .collect()
}

fn determinism() -> Check {
    let golden: BTreeMap<String, String> =
        serde_json::from_str(include_str!("fixtures/golden_reset_sha256.json")).map_err(|e| e.to_string())?;
    let exe = std::env::current_exe().map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    for _ in 0..2 {
        let out = Command::new(&exe)
            .env(CHILD_VAR, "1")
            .output()
            .map_err(|e| e.to_string())?;
        if !out.status.success() {
            return Err("digest child failed".into());
        }
        outputs.push(String::from_utf8_lossy(&out.stdout).into_owned());
    }
    if outputs[0] != outputs[1] {
        return Err(format!("processes disagree:\n{}\n{}", outputs[0], outputs[1]));
    }
    if outputs[0] != digest_report() {
        return Err("child process disagrees with parent".into());
    }
    for line in outputs[0].lines() {
        let mut f = line.split(' ');
        let (name, reset) = (f.next().unwrap(), f.next().unwrap());
        match golden.get(name) {
            Some(g) if g == reset => {}
            other => return Err(format!("{name}: reset hash {reset}, golden {other:?}")),
        }
    }
    Ok(format!(
        "2 processes x {} envs identical, reset frames match golden hashes",
        ENV_NAMES.len()
    ))
}

// -------------------------------------------------------- scripted oracles

fn scripted_wins(name: &str, want: Reason) -> usize {
    let cfg = EnvConfig::default();
    (0..1000u64)
        .filter(|&seed| {
            let mut d = cfg.dynamics(name).unwrap();
            d.reset(&mut SplitMix64::new(seed));
            loop {
                d.advance(d.scripted_action());
                let j = d.judge();
                if j.done() {
                    return j.reason == want;
                }
            }
        })
        .count()
}

fn scripted_oracles() -> Check {
    let goalie = scripted_wins("goalie", Reason::Caught);
    let hover = scripted_wins("hover2d", Reason::Win);
    ensure(
        goalie == 1000 && hover >= 990,
        format!("goalie caught {goalie}/1000, hover2d reached target {hover}/1000"),
    )
}

// ---------------------------------------------------------------- protocol

fn protocol_script() -> Vec<String> {
    let mut lines = Vec::new();
    for name in ENV_NAMES {
        lines.push(
            Request::Hello {
                env: name.into(),
                seed: Some(5),
            }
            .to_line(),
        );
        lines.push(Request::Reset { seed: None }.to_line());
        let mut rng = SplitMix64::new(5);
        for _ in 0..40 {
            lines.push(
                Request::Step {
                    action: rng.below(2) as i64,
                }
                .to_line(),
            );
        }
    }
    lines.push(Request::Close.to_line());
    lines
}

/// Malformed or adversarial lines: random bytes, truncated and mutated
/// valid requests, wrong types, huge numbers.
fn fuzz_lines(count: usize) -> Vec<Vec<u8>> {
    let templates = [
        r#"{"type":"hello","env":"goalie","seed":3}"#,
        r#"{"type":"reset","seed":18446744073709551615}"#,
        r#"{"type":"step","action":1}"#,
        r#"{"type":"close"}"#,
    ];
    let mut rng = SplitMix64::new(0xF022);
    (0..count)
        .map(|i| {
            let mut line = templates[i % templates.len()].as_bytes().to_vec();
            match rng.below(6) {
                0 => {
                    let len = rng.below(120) as usize;
                    line = (0..len).map(|_| rng.below(256) as u8).collect();
                }
                1 => line.truncate(rng.below(line.len() as u64) as usize),
                2 => {
                    for _ in 0..=rng.below(4) {
                        let at = rng.below(line.len() as u64) as usize;
                        line[at] = rng.below(256) as u8;
                    }
                }
                3 => {
                    let junk: [&[u8]; 6] = [b"null", b"[]", b"-1e999", b"\"x\"", b"{}", b"99999999999999999999999"];
                    line = format!(
                        r#"{{"type":"step","action":{}}}"#,
                        String::from_utf8_lossy(junk[rng.below(6) as usize])
                    )
                    .into_bytes();
                }
                4 => line = format!(r#"{{"type":"{}"}}"#, rng.next_u64()).into_bytes(),
                _ => line.extend_from_slice(b"}}}"),
            }
            // Newlines would split one case into several; the server handles
            // that fine, but it breaks one-response-per-case accounting.
            line.retain(|&b| b != b'\n' && b != b'\r');
            if line.iter().all(u8::is_ascii_whitespace) {
                line = b"x".to_vec();
            }
            // Closing would end the session early.
            if line.windows(5).any(|w| w == b"close") {
                line = b"{\"type\":\"cl0se\"}".to_vec();
            }
            line
        })
        .collect()
}

fn in_process(lines: &[String]) -> Vec<String> {
    let mut s = Session::new(EnvConfig::default());
    lines.iter().map(|l| s.handle_line(l).to_line()).collect()
}

fn stdio_child(lines: &[Vec<u8>]) -> Result<Vec<String>, String> {
    let mut child = Command::new(env!("CARGO_BIN_EXE_pixgym"))
        .args(["serve", "--transport", "stdio"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .map_err(|e| e.to_string())?;
    let mut stdin = child.stdin.take().unwrap();
    let payload: Vec<u8> = lines.iter().flat_map(|l| l.iter().copied().chain(*b"\n")).collect();
    let writer = thread::spawn(move || {
        let _ = stdin.write_all(&payload);
    });
    let stdout = BufReader::new(child.stdout.take().unwrap());
    let got: Vec<String> = stdout.lines().map_while(Result::ok).collect();
    writer.join().unwrap();
    let status = child.wait().map_err(|e| e.to_string())?;
    if !status.success() {
        return Err(format!("stdio server exited with {status}"));
    }
    Ok(got)
}

fn protocol() -> Check {
    let lines = protocol_script();
    let expected = in_process(&lines);

    let listener = TcpListener::bind("127.0.0.1:0").map_err(|e| e.to_string())?;
    let addr = listener.local_addr().unwrap();
    thread::spawn(move || serve_listener(listener, EnvConfig::default()));
    let mut client = WireClient::connect(addr).map_err(|e| e.to_string())?;
    let tcp: Vec<String> = lines
        .iter()
        .map(|l| client.roundtrip_raw(l).unwrap_or_default())
        .collect();
    if tcp != expected {
        return Err("tcp responses differ from in-process session".into());
    }
    let raw: Vec<Vec<u8>> = lines.iter().map(|l| l.clone().into_bytes()).collect();
    if stdio_child(&raw)? != expected {
        return Err("stdio responses differ from in-process session".into());
    }

    // Fuzz: every case gets exactly one well-formed response and the
    // session still works afterwards.
    const CASES: usize = 10_000;
    let mut fuzz = vec![
        br#"{"type":"hello","env":"goalie"}"#.to_vec(),
        br#"{"type":"reset"}"#.to_vec(),
    ];
    fuzz.extend(fuzz_lines(CASES));
    fuzz.push(br#"{"type":"hello","env":"cartpole"}"#.to_vec());
    fuzz.push(br#"{"type":"reset","seed":1}"#.to_vec());
    fuzz.push(br#"{"type":"close"}"#.to_vec());
    let out = stdio_child(&fuzz)?;
    if out.len() != fuzz.len() {
        return Err(format!("{} responses for {} lines", out.len(), fuzz.len()));
    }
    let mut errors = 0;
    for l in &out {
        match serde_json::from_str::<Response>(l) {
            Ok(Response::Error { .. }) => errors += 1,
            Ok(_) => {}
            Err(e) => return Err(format!("unparseable response {l}: {e}")),
        }
    }
    let tail_ok = matches!(
        serde_json::from_str(&out[out.len() - 2]),
        Ok(Response::Obs { step: 0, .. })
    ) && out.last().map(String::as_str) == Some(r#"{"type":"bye"}"#);

    // The same fuzz over TCP must leave the listener serving new clients.
    let mut tcp_client = WireClient::connect(addr).map_err(|e| e.to_string())?;
    for l in fuzz.iter().take(fuzz.len() - 1) {
        tcp_client
            .roundtrip_raw(&String::from_utf8_lossy(l))
            .map_err(|e| format!("tcp fuzz: {e}"))?;
    }
    let mut fresh = WireClient::connect(addr).map_err(|e| e.to_string())?;
    fresh.hello("hover2d", None).map_err(|e| e.to_string())?;
    fresh.reset(Some(2)).map_err(|e| e.to_string())?;

    ensure(
        tail_ok,
        format!(
            "{} scripted lines identical in-process/tcp/stdio; {CASES} fuzz cases, {errors} error responses, 0 crashes",
            lines.len()
        ),
    )
}

fn main() -> ExitCode {
    if std::env::var_os(CHILD_VAR).is_some() {
        print!("{}", digest_report());
        return ExitCode::SUCCESS;
    }
    let criteria: [Criterion; 7] = [
        ("observation contract", observation_contract),
        ("render time", render_time),
        ("cartpole oracle equivalence", cartpole_oracle),
        ("reward schedules", reward_schedules),
        ("determinism", determinism),
        ("scripted-policy oracles", scripted_oracles),
        ("protocol", protocol),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let result = check();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS {name}: {detail} [{secs:.1}s]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name}: {detail} [{secs:.1}s]");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
