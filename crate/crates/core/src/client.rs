//! Minimal blocking client for the wire protocol, used by the examples and
//! tests. One request in flight at a time.

use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::net::{TcpStream, ToSocketAddrs};

use thiserror::Error;

use crate::env::{ActionSpace, ObservationSpec, Reason};
use crate::protocol::{decode_obs, ErrorCode, Request, Response};

#[derive(Debug, Error)]
pub enum ClientError {
    #[error("transport: {0}")]
    Io(#[from] io::Error),
    #[error("server closed the connection")]
    Closed,
    #[error("malformed response: {0}")]
    Malformed(String),
    #[error("server error {code:?}: {message}")]
    Server { code: ErrorCode, message: String },
}

/// A decoded observation response.
#[derive(Debug, Clone, PartialEq)]
pub struct WireObs {
    pub obs: Vec<u8>,
    pub reward: f64,
    pub done: bool,
    pub reason: Reason,
    pub step: u64,
}

pub struct WireClient<R, W> {
    reader: R,
    writer: W,
    line: String,
}

impl WireClient<BufReader<TcpStream>, BufWriter<TcpStream>> {
    pub fn connect(addr: impl ToSocketAddrs) -> Result<Self, ClientError> {
        let stream = TcpStream::connect(addr)?;
        stream.set_nodelay(true)?;
        Ok(Self::new(BufReader::new(stream.try_clone()?), BufWriter::new(stream)))
    }
}

impl<R: BufRead, W: Write> WireClient<R, W> {
    pub fn new(reader: R, writer: W) -> Self {
        Self {
            reader,
            writer,
            line: String::new(),
        }
    }

    /// Sends one raw line and reads one raw response line.
    pub fn roundtrip_raw(&mut self, line: &str) -> Result<String, ClientError> {
        self.writer.write_all(line.as_bytes())?;
        self.writer.write_all(b"\n")?;
        self.writer.flush()?;
        self.line.clear();
        if self.reader.read_line(&mut self.line)? == 0 {
            return Err(ClientError::Closed);
        }
        Ok(self.line.trim_end().to_owned())
    }

    pub fn request(&mut self, req: &Request) -> Result<Response, ClientError> {
        let raw = self.roundtrip_raw(&req.to_line())?;
        let resp: Response = serde_json::from_str(&raw).map_err(|e| ClientError::Malformed(e.to_string()))?;
        match resp {
            Response::Error { code, message } => Err(ClientError::Server { code, message }),
            other => Ok(other),
        }
    }

    pub fn hello(&mut self, env: &str, seed: Option<u64>) -> Result<(ObservationSpec, ActionSpace), ClientError> {
        match self.request(&Request::Hello {
            env: env.to_owned(),
            seed,
        })? {
            Response::HelloAck { spec, action_space, .. } => Ok((spec, action_space)),
            other => Err(ClientError::Malformed(format!("expected hello_ack, got {other:?}"))),
        }
    }

    pub fn reset(&mut self, seed: Option<u64>) -> Result<WireObs, ClientError> {
        let resp = self.request(&Request::Reset { seed })?;
        into_obs(resp)
    }

    pub fn step(&mut self, action: i64) -> Result<WireObs, ClientError> {
        let resp = self.request(&Request::Step { action })?;
        into_obs(resp)
    }

    pub fn close(&mut self) -> Result<(), ClientError> {
        match self.request(&Request::Close)? {
            Response::Bye => Ok(()),
            other => Err(ClientError::Malformed(format!("expected bye, got {other:?}"))),
        }
    }
}

fn into_obs(resp: Response) -> Result<WireObs, ClientError> {
    match resp {
        Response::Obs {
            reward,
            done,
            reason,
            step,
            obs_b64,
        } => Ok(WireObs {
            obs: decode_obs(&obs_b64).map_err(|e| ClientError::Malformed(e.to_string()))?,
            reward,
            done,
            reason,
            step,
        }),
        other => Err(ClientError::Malformed(format!("expected obs, got {other:?}"))),
    }
}
