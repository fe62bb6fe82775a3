//! Report assembly: human-readable lines plus a machine-readable key=value
//! block that CI can parse when `--machine-readable` is set.

pub struct Report {
    human: Vec<String>,
    machine: Vec<(String, String)>,
}

impl Report {
    pub fn new() -> Self {
        Report { human: Vec::new(), machine: Vec::new() }
    }

    /// Adds a human-readable line.
    pub fn line(&mut self, text: impl Into<String>) {
        self.human.push(text.into());
    }

    /// Adds a machine-readable key=value pair.
    pub fn kv(&mut self, key: impl Into<String>, value: impl ToString) {
        self.machine.push((key.into(), value.to_string()));
    }

    /// Adds a line and records the same fact under `key`.
    pub fn fact(&mut self, key: impl Into<String>, value: impl ToString, text: impl Into<String>) {
        self.kv(key, value.to_string());
        self.line(text);
    }

    pub fn print(&self, machine_readable: bool) {
        for line in &self.human {
            println!("{line}");
        }
        if machine_readable {
            println!("--- machine-readable ---");
            for (key, value) in &self.machine {
                println!("{key}={value}");
            }
            println!("--- end ---");
        }
    }
}

impl Default for Report {
    fn default() -> Self {
        Self::new()
    }
}

/// Digit vectors of an input window rendered as `d,d;d,d`.
pub fn render_witness(witness: &[Vec<u64>]) -> String {
    witness
        .iter()
        .map(|block| {
            block.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
        })
        .collect::<Vec<_>>()
        .join(";")
}
