//! Decoder transport for external pirate boxes.
//!
//! Protocol, line oriented: the tracer writes one base64-armored ciphertext
//! artifact per line to the decoder's stdin; the decoder answers with one
//! line, either the armored plaintext encoding or the literal token `BOT`
//! for no-answer. Any malformed reply counts as a miss. A broken pipe or
//! EOF marks the transport failed; the tracer then aborts without a
//! verdict.

use std::io::{BufRead, BufReader, Write};
use std::process::{Child, ChildStdin, ChildStdout, Command, Stdio};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Mutex;

use aibe::codec::{self, SchemeId};
use aibe::tracing::{Decoder, DecoderQuery};
use anyhow::{Context, Result};

pub const NO_ANSWER_TOKEN: &str = "BOT";

pub struct ExecDecoder {
    scheme: SchemeId,
    child: Mutex<(ChildStdin, BufReader<ChildStdout>)>,
    process: Mutex<Child>,
    transport_failed: AtomicBool,
}

impl ExecDecoder {
    pub fn spawn(scheme: SchemeId, command_line: &str) -> Result<Self> {
        let mut parts = command_line.split_whitespace();
        let program = parts
            .next()
            .context("empty decoder command line")?
            .to_string();
        let mut child = Command::new(&program)
            .args(parts)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .spawn()
            .with_context(|| format!("spawning decoder process `{program}`"))?;
        let stdin = child.stdin.take().context("decoder stdin unavailable")?;
        let stdout = child.stdout.take().context("decoder stdout unavailable")?;
        Ok(Self {
            scheme,
            child: Mutex::new((stdin, BufReader::new(stdout))),
            process: Mutex::new(child),
            transport_failed: AtomicBool::new(false),
        })
    }

    /// Whether any query failed at the transport level; a trace run that
    /// saw this must be discarded rather than turned into a verdict.
    pub fn transport_failed(&self) -> bool {
        self.transport_failed.load(Ordering::Relaxed)
    }

    fn exchange(&self, ciphertext: &[u8]) -> std::io::Result<String> {
        let mut io = self.child.lock().expect("decoder transport poisoned");
        writeln!(io.0, "{}", codec::armor(ciphertext))?;
        io.0.flush()?;
        let mut line = String::new();
        let n = io.1.read_line(&mut line)?;
        if n == 0 {
            return Err(std::io::Error::new(
                std::io::ErrorKind::UnexpectedEof,
                "decoder closed its output",
            ));
        }
        Ok(line)
    }
}

impl Decoder for ExecDecoder {
    fn scheme(&self) -> SchemeId {
        self.scheme
    }

    fn decrypt(&self, query: &DecoderQuery<'_>) -> Option<Vec<u8>> {
        if self.transport_failed() {
            return None;
        }
        match self.exchange(query.ciphertext) {
            Ok(line) => {
                let trimmed = line.trim();
                if trimmed == NO_ANSWER_TOKEN || trimmed.is_empty() {
                    return None;
                }
                // Anything that does not dearmor is a malformed reply — a miss.
                codec::dearmor(trimmed).ok()
            }
            Err(_) => {
                self.transport_failed.store(true, Ordering::Relaxed);
                None
            }
        }
    }

    /// The protocol requires the external box to be stateless; the tracer
    /// cannot verify it and trusts the declaration.
    fn stateless(&self) -> bool {
        true
    }
}

impl Drop for ExecDecoder {
    fn drop(&mut self) {
        if let Ok(mut child) = self.process.lock() {
            let _ = child.kill();
            let _ = child.wait();
        }
    }
}
