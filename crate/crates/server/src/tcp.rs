//! Raw TCP transport: newline-delimited JSON in both directions.

use tokio::io::{AsyncBufReadExt, AsyncWriteExt, BufReader};
use tokio::net::{TcpListener, TcpStream};

use crate::hub::Hub;

/// Accepts connections until the listener fails.
pub async fn serve_tcp(listener: TcpListener, hub: Hub) -> std::io::Result<()> {
    loop {
        let (stream, peer) = listener.accept().await?;
        tracing::debug!(%peer, "tcp client connected");
        tokio::spawn(handle(stream, hub.clone()));
    }
}

async fn handle(stream: TcpStream, hub: Hub) {
    let (read, mut write) = stream.into_split();
    let (input, mut output) = hub.connect().split();
    let writer = tokio::spawn(async move {
        while let Some(mut line) = output.recv().await {
            line.push('\n');
            if write.write_all(line.as_bytes()).await.is_err() {
                break;
            }
        }
    });
    let mut lines = BufReader::new(read).lines();
    while let Ok(Some(line)) = lines.next_line().await {
        input.send(line);
    }
    drop(input);
    writer.abort();
}
