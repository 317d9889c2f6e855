use serde::Serialize;
use sha2::{Digest, Sha256};

/// Provenance of one run. The digest covers everything that determines the
/// output bytes and nothing else (not `--jobs`, not `--out`).
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub digest: String,
    /// `SOURCE_DATE_EPOCH` when set; wall-clock time would break
    /// byte-identical reruns.
    pub timestamp: String,
    pub params: Vec<(String, String)>,
}

impl RunManifest {
    pub fn new(command: &str, params: Vec<(String, String)>) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(command.as_bytes());
        hasher.update(b"\n");
        for (k, v) in &params {
            hasher.update(format!("{k}={v}\n").as_bytes());
        }
        Self {
            tool: "spp".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            digest: format!("sha256:{}", hex::encode(hasher.finalize())),
            timestamp: std::env::var("SOURCE_DATE_EPOCH").unwrap_or_else(|_| "unset".into()),
            params,
        }
    }

    /// `# `-prefixed header lines for CSV output.
    pub fn header(&self) -> String {
        let mut s = format!(
            "# {} {}\n# command: {}\n# digest: {}\n# timestamp: {}\n",
            self.tool, self.version, self.command, self.digest, self.timestamp
        );
        for (k, v) in &self.params {
            s.push_str(&format!("# param {k} = {v}\n"));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(v: &str) -> Vec<(String, String)> {
        vec![("mu".into(), v.into())]
    }

    #[test]
    fn digest_is_reproducible() {
        let a = RunManifest::new("optimize", params("0.65"));
        let b = RunManifest::new("optimize", params("0.65"));
        assert_eq!(a.digest, b.digest);
        assert_ne!(
            a.digest,
            RunManifest::new("optimize", params("0.66")).digest
        );
        assert_ne!(
            a.digest,
            RunManifest::new("propagate", params("0.65")).digest
        );
        assert_eq!(a.digest.len(), "sha256:".len() + 64);
    }
}
