//! Transports for the wire protocol: stdio (one session) and TCP (one
//! session per connection, each on its own thread).

use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::net::{TcpListener, TcpStream, ToSocketAddrs};
use std::thread;

use crate::envs::EnvConfig;
use crate::protocol::{ErrorCode, Response, Session};

/// Serves one session until EOF or `close`.
pub fn serve_stream<R: BufRead, W: Write>(mut reader: R, mut writer: W, config: EnvConfig) -> io::Result<()> {
    let mut session = Session::new(config);
    let mut buf = Vec::new();
    loop {
        buf.clear();
        if reader.read_until(b'\n', &mut buf)? == 0 {
            return Ok(());
        }
        while matches!(buf.last(), Some(b'\n' | b'\r')) {
            buf.pop();
        }
        if buf.iter().all(u8::is_ascii_whitespace) {
            continue;
        }
        let response = match std::str::from_utf8(&buf) {
            Ok(line) => session.handle_line(line),
            Err(e) => Response::error(ErrorCode::BadJson, format!("line is not UTF-8: {e}")),
        };
        writer.write_all(response.to_line().as_bytes())?;
        writer.write_all(b"\n")?;
        writer.flush()?;
        if session.is_closed() {
            return Ok(());
        }
    }
}

pub fn serve_stdio(config: EnvConfig) -> io::Result<()> {
    let stdin = io::stdin();
    let stdout = io::stdout();
    serve_stream(stdin.lock(), BufWriter::new(stdout.lock()), config)
}

fn serve_connection(stream: TcpStream, config: EnvConfig) -> io::Result<()> {
    stream.set_nodelay(true)?;
    let reader = BufReader::new(stream.try_clone()?);
    serve_stream(reader, BufWriter::new(stream), config)
}

/// Accepts connections forever, one worker thread per connection.
pub fn serve_listener(listener: TcpListener, config: EnvConfig) -> io::Result<()> {
    for stream in listener.incoming() {
        let stream = match stream {
            Ok(s) => s,
            Err(e) => {
                log::warn!("accept failed: {e}");
                continue;
            }
        };
        let config = config.clone();
        thread::spawn(move || {
            let peer = stream.peer_addr().ok();
            if let Err(e) = serve_connection(stream, config) {
                log::debug!("connection {peer:?} ended: {e}");
            }
        });
    }
    Ok(())
}

pub fn serve_tcp(addr: impl ToSocketAddrs, config: EnvConfig) -> io::Result<()> {
    serve_listener(TcpListener::bind(addr)?, config)
}
