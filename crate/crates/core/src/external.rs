//! Backend adapter for an external engine speaking line-delimited JSON over
//! a child process's stdin and stdout.
//!
//! Request: `{"id": 1, "question": "...", "kind": "ENTITY"}`.
//! Response: `{"id": 1, "answers": [{"value": "...", "predicates": ["..."]}]}`,
//! optionally with an `"error"` string.

use std::io::{BufRead, BufReader, Write};
use std::process::{Child, ChildStdin, ChildStdout, Command, Stdio};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::kb::{AnswerKind, Backend, BackendAnswer, BackendError, BackendQuery, BackendResult};
use crate::model::AnswerValue;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WireRequest {
    pub id: u64,
    pub question: String,
    pub kind: AnswerKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WireResponse {
    pub id: u64,
    #[serde(default)]
    pub answers: Vec<BackendAnswer>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

struct Channel {
    child: Child,
    stdin: ChildStdin,
    stdout: BufReader<ChildStdout>,
    next_id: u64,
}

/// Runs one external process and sends it one query at a time.
pub struct CommandBackend {
    command: String,
    channel: Mutex<Channel>,
}

impl std::fmt::Debug for CommandBackend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CommandBackend")
            .field("command", &self.command)
            .finish_non_exhaustive()
    }
}

impl CommandBackend {
    /// Starts `command`, split on whitespace into program and arguments.
    pub fn spawn(command: &str) -> Result<Self, BackendError> {
        let mut parts = command.split_whitespace();
        let program = parts
            .next()
            .ok_or_else(|| BackendError::Io("empty backend command".into()))?;
        let mut child = Command::new(program)
            .args(parts)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .spawn()
            .map_err(|e| BackendError::Io(format!("cannot start {program}: {e}")))?;
        let stdin = child.stdin.take().expect("stdin is piped");
        let stdout = BufReader::new(child.stdout.take().expect("stdout is piped"));
        Ok(Self {
            command: command.to_string(),
            channel: Mutex::new(Channel {
                child,
                stdin,
                stdout,
                next_id: 1,
            }),
        })
    }

    pub fn command(&self) -> &str {
        &self.command
    }
}

impl Backend for CommandBackend {
    fn answer(&self, query: &BackendQuery) -> Result<BackendResult, BackendError> {
        let mut channel = self
            .channel
            .lock()
            .map_err(|_| BackendError::Io("backend channel poisoned".into()))?;
        let id = channel.next_id;
        channel.next_id += 1;
        let request = WireRequest {
            id,
            question: query.question.clone(),
            kind: query.kind,
        };
        let line =
            serde_json::to_string(&request).map_err(|e| BackendError::Protocol(e.to_string()))?;
        writeln!(channel.stdin, "{line}")
            .and_then(|_| channel.stdin.flush())
            .map_err(|e| BackendError::Io(e.to_string()))?;
        let mut reply = String::new();
        let n = channel
            .stdout
            .read_line(&mut reply)
            .map_err(|e| BackendError::Io(e.to_string()))?;
        if n == 0 {
            return Err(BackendError::Io("backend closed its output".into()));
        }
        let response: WireResponse = serde_json::from_str(&reply)
            .map_err(|e| BackendError::Protocol(format!("{e}: {}", reply.trim())))?;
        if response.id != id {
            return Err(BackendError::Protocol(format!(
                "expected response id {id}, got {}",
                response.id
            )));
        }
        if let Some(error) = response.error {
            return Err(BackendError::NoPredicateMatched(error));
        }
        if query.kind == AnswerKind::Date
            && response
                .answers
                .iter()
                .any(|a| !matches!(a.value, AnswerValue::Date(_)))
        {
            return Err(BackendError::Protocol(
                "date query answered with a non-date".into(),
            ));
        }
        Ok(BackendResult {
            answers: response.answers,
            diagnostic: None,
        })
    }

    fn single_flight(&self) -> bool {
        true
    }
}

impl Drop for CommandBackend {
    fn drop(&mut self) {
        if let Ok(channel) = self.channel.get_mut() {
            let _ = channel.child.kill();
            let _ = channel.child.wait();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wire_format() {
        let request = WireRequest {
            id: 3,
            question: "when did neymar join psg?".into(),
            kind: AnswerKind::Date,
        };
        assert_eq!(
            serde_json::to_string(&request).unwrap(),
            r#"{"id":3,"question":"when did neymar join psg?","kind":"DATE"}"#
        );
        let response: WireResponse = serde_json::from_str(
            r#"{"id":3,"answers":[{"value":"2017-08-03","predicates":["p"]}]}"#,
        )
        .unwrap();
        assert_eq!(
            response.answers[0].value,
            AnswerValue::Date("2017-08-03".parse().unwrap())
        );
    }

    #[test]
    fn missing_program_is_an_io_error() {
        assert!(matches!(
            CommandBackend::spawn("/nonexistent/backend-binary"),
            Err(BackendError::Io(_))
        ));
        assert!(CommandBackend::spawn("   ").is_err());
    }

    #[test]
    fn talks_to_a_shell_echo_backend() {
        // replies to every request with a fixed answer, echoing ids 1, 2, ...
        let script = r#"i=1; while read -r line; do echo "{\"id\":$i,\"answers\":[{\"value\":\"santos_fc\",\"predicates\":[\"footballPlayer.team\"]}]}"; i=$((i+1)); done"#;
        let path = std::env::temp_dir().join(format!("tempqa-echo-{}.sh", std::process::id()));
        std::fs::write(&path, script).unwrap();
        let backend = CommandBackend::spawn(&format!("sh {}", path.display())).unwrap();
        for _ in 0..2 {
            let r = backend
                .answer(&BackendQuery::new(
                    "where did neymar play?",
                    AnswerKind::Entity,
                ))
                .unwrap();
            assert_eq!(r.answers[0].value, AnswerValue::Entity("santos_fc".into()));
        }
        assert!(matches!(
            backend.answer(&BackendQuery::new("when?", AnswerKind::Date)),
            Err(BackendError::Protocol(_))
        ));
        drop(backend);
        let _ = std::fs::remove_file(path);
    }
}
