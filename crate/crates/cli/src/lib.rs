//! Documents, query execution and reports for the `cu-lab` binary.

pub mod demos;
pub mod document;
pub mod env;
pub mod error;
pub mod report;
pub mod run;

pub use document::{parse_document, serialize_document, Document, Query};
pub use error::CliError;
pub use report::{Outcome, Report};
pub use run::{run, Options};

/// A one-query document running the named fixture.
pub fn demo_document(name: &str) -> Document {
    let mut d = Document::empty();
    d.queries.push(Query::Demo {
        name: name.to_string(),
    });
    d
}
