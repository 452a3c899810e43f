use clap::ValueEnum;
use serde_json::Value;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    #[default]
    Human,
}

/// One command's result in all three renderings.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub json: Value,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub human: String,
}

impl Report {
    pub fn new(json: Value, header: &[&str], rows: Vec<Vec<String>>, human: String) -> Self {
        Report {
            json,
            header: header.iter().map(|h| h.to_string()).collect(),
            rows,
            human,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => format!(
                "{}\n",
                serde_json::to_string_pretty(&self.json).expect("JSON values serialize")
            ),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.header).expect("in-memory write");
                for row in &self.rows {
                    w.write_record(row).expect("in-memory write");
                }
                String::from_utf8(w.into_inner().expect("in-memory flush")).expect("UTF-8 fields")
            }
            Format::Human => {
                let mut s = self.human.clone();
                if !s.ends_with('\n') {
                    s.push('\n');
                }
                s
            }
        }
    }
}
