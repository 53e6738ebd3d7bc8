//! Writes sample input documents for the `qcalab` binary into a directory (default `./qcalab-docs`).

use std::path::PathBuf;
use std::sync::Arc;

use qcalab::cli::{write_document, Document, Payload};
use qcalab::index::pump;
use qcalab::qca::translation;
use qcalab::{Field, Mat, MetricSpace, SpinSystem};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "qcalab-docs".into()));
    std::fs::create_dir_all(&dir)?;
    let f3 = Field::fp(3)?;
    let circle = Arc::new(MetricSpace::circle(8)?);
    let sys = Arc::new(SpinSystem::uniform(circle, 2)?);
    let docs = [
        ("translation.json", Document { field: f3, payload: Payload::Homo(translation(&sys, f3, 1)?) }),
        ("pump23.json", Document { field: Field::Q, payload: Payload::Homo(pump(2, 3, 6, Field::Q)?) }),
        ("system12.json", Document { field: Field::Q, payload: Payload::System(Arc::new(SpinSystem::new(Arc::new(MetricSpace::interval(3)?), vec![12, 1, 1])?)) }),
        ("system_moved.json", Document { field: Field::Q, payload: Payload::System(Arc::new(SpinSystem::new(Arc::new(MetricSpace::interval(3)?), vec![4, 1, 3])?)) }),
        ("diag41.json", Document { field: Field::Q, payload: Payload::Matrix(Mat::diag(Field::Q, &[Field::Q.int(4), Field::Q.int(1)])) }),
    ];
    for (name, doc) in &docs {
        let path = dir.join(name);
        write_document(&path, doc).map_err(|e| format!("{e:?}"))?;
        println!("wrote {}", path.display());
    }
    println!("try: qcalab index {}/translation.json --all-cuts", dir.display());
    Ok(())
}
