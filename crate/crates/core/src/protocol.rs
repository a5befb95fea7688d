//! JSON-lines wire protocol for driving an environment from another process.
//!
//! Every request and response is one UTF-8 JSON object terminated by `\n`,
//! discriminated by its `"type"` field. Requests are answered strictly in
//! order, exactly one response per non-blank line.
//!
//! ```text
//! -> {"type":"hello","env":"goalie","seed":9}
//! <- {"type":"hello_ack","env":"goalie","spec":{"height":100,"width":100,"depth":4},"action_space":{"n":2}}
//! -> {"type":"reset"}
//! <- {"type":"obs","reward":0.0,"done":false,"reason":"running","step":0,"obs_b64":"..."}
//! -> {"type":"step","action":1}
//! <- {"type":"obs","reward":0.0,"done":false,"reason":"running","step":1,"obs_b64":"..."}
//! -> {"type":"close"}
//! <- {"type":"bye"}
//! ```
//!
//! `obs_b64` is standard padded base64 of the observation tensor: `H*W*D`
//! bytes in height, width, depth order with depth fastest and the oldest
//! frame at depth 0. Pixels are raw 8-bit luminance; scaling to `[0, 1]` is
//! left to the client.

use base64::engine::general_purpose::STANDARD as B64;
use base64::Engine as _;
use serde::{Deserialize, Serialize};

use crate::env::{ActionSpace, DynEnv, EnvError, ObsStack, ObservationSpec, Reason, Seed};
use crate::envs::EnvConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Request {
    /// Selects the environment for this connection. `seed` becomes the
    /// default for later resets.
    Hello {
        env: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
    },
    Reset {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
    },
    Step {
        action: i64,
    },
    Close,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorCode {
    /// Line is not valid JSON (or not UTF-8).
    BadJson,
    /// Valid JSON, but not a known request.
    BadRequest,
    UnknownEnv,
    /// `reset` before any `hello`.
    NoEnv,
    /// `step` before `reset`.
    NotReset,
    /// `step` after the episode ended.
    Done,
    InvalidAction,
    Internal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Response {
    HelloAck {
        env: String,
        spec: ObservationSpec,
        action_space: ActionSpace,
    },
    Obs {
        reward: f64,
        done: bool,
        reason: Reason,
        step: u64,
        obs_b64: String,
    },
    Error {
        code: ErrorCode,
        message: String,
    },
    Bye,
}

impl Response {
    pub fn error(code: ErrorCode, message: impl Into<String>) -> Self {
        Response::Error {
            code,
            message: message.into(),
        }
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("responses always serialize")
    }
}

impl Request {
    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("requests always serialize")
    }
}

pub fn encode_obs(stack: &ObsStack) -> String {
    B64.encode(stack.to_bytes())
}

pub fn decode_obs(obs_b64: &str) -> Result<Vec<u8>, base64::DecodeError> {
    B64.decode(obs_b64)
}

/// Parses one request line, mapping failures to the error response to send.
pub fn parse_request(line: &str) -> Result<Request, Response> {
    match serde_json::from_str::<Request>(line) {
        Ok(req) => Ok(req),
        Err(e) if e.is_syntax() || e.is_eof() => Err(Response::error(ErrorCode::BadJson, e.to_string())),
        Err(e) => Err(Response::error(ErrorCode::BadRequest, e.to_string())),
    }
}

/// Per-connection protocol state: at most one environment, driven
/// sequentially.
pub struct Session {
    config: EnvConfig,
    env: Option<DynEnv>,
    default_seed: u64,
    closed: bool,
}

impl Session {
    pub fn new(config: EnvConfig) -> Self {
        Self {
            config,
            env: None,
            default_seed: 0,
            closed: false,
        }
    }

    /// True once a `close` request has been answered.
    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn handle_line(&mut self, line: &str) -> Response {
        match parse_request(line) {
            Ok(req) => self.handle(req),
            Err(resp) => resp,
        }
    }

    pub fn handle(&mut self, req: Request) -> Response {
        match req {
            Request::Hello { env, seed } => match self.config.make(&env) {
                Ok(e) => {
                    let resp = Response::HelloAck {
                        env: e.name().to_owned(),
                        spec: e.observation_spec(),
                        action_space: e.action_space(),
                    };
                    self.env = Some(e);
                    self.default_seed = seed.unwrap_or(0);
                    resp
                }
                Err(err) => Response::error(ErrorCode::UnknownEnv, err.to_string()),
            },
            Request::Reset { seed } => {
                let seed = seed.unwrap_or(self.default_seed);
                let Some(env) = self.env.as_mut() else {
                    return Response::error(ErrorCode::NoEnv, "send hello before reset");
                };
                match env.reset(Seed(seed)) {
                    Ok(stack) => Response::Obs {
                        reward: 0.0,
                        done: false,
                        reason: Reason::Running,
                        step: 0,
                        obs_b64: encode_obs(stack),
                    },
                    Err(e) => env_error(e),
                }
            }
            Request::Step { action } => {
                let Some(env) = self.env.as_mut() else {
                    return Response::error(ErrorCode::NotReset, "no environment; send hello and reset first");
                };
                match env.step(action) {
                    Ok(r) => Response::Obs {
                        reward: r.reward,
                        done: r.done,
                        reason: r.reason,
                        step: r.step_index,
                        obs_b64: encode_obs(&r.obs),
                    },
                    Err(e) => env_error(e),
                }
            }
            Request::Close => {
                self.closed = true;
                self.env = None;
                Response::Bye
            }
        }
    }
}

fn env_error(e: EnvError) -> Response {
    let code = match e {
        EnvError::InvalidAction { .. } => ErrorCode::InvalidAction,
        EnvError::SteppedAfterDone => ErrorCode::Done,
        EnvError::NotReset => ErrorCode::NotReset,
        EnvError::UnknownEnv(_) => ErrorCode::UnknownEnv,
        EnvError::Render(_) => ErrorCode::Internal,
    };
    Response::error(code, e.to_string())
}
