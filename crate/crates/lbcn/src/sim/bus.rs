//! Lockstep broadcast: messages posted in a round are delivered to everyone
//! once the round closes.

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Message {
    pub sender: u64,
    pub round: usize,
    pub payload: Vec<u8>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum BusError {
    #[error("no round is open")]
    NoOpenRound,
    #[error("round {0} is still open")]
    RoundStillOpen(usize),
    #[error("round {0} has not been opened")]
    NoSuchRound(usize),
    #[error("participant {sender} already posted in round {round}")]
    DuplicateSender { sender: u64, round: usize },
}

/// Append-only record of every broadcast, one message set per round.
#[derive(Clone, Debug, Default)]
pub struct BroadcastBus {
    rounds: Vec<Vec<Message>>,
    open: bool,
}

impl BroadcastBus {
    pub fn new() -> Self {
        Self::default()
    }

    /// Starts the next round and returns its index.
    pub fn open_round(&mut self) -> Result<usize, BusError> {
        if self.open {
            return Err(BusError::RoundStillOpen(self.rounds.len() - 1));
        }
        self.rounds.push(Vec::new());
        self.open = true;
        Ok(self.rounds.len() - 1)
    }

    pub fn post(&mut self, sender: u64, payload: Vec<u8>) -> Result<(), BusError> {
        if !self.open {
            return Err(BusError::NoOpenRound);
        }
        let round = self.rounds.len() - 1;
        let msgs = self.rounds.last_mut().expect("open round exists");
        if msgs.iter().any(|m| m.sender == sender) {
            return Err(BusError::DuplicateSender { sender, round });
        }
        msgs.push(Message { sender, round, payload });
        Ok(())
    }

    /// Closes the open round; its messages become readable.
    pub fn close_round(&mut self) -> Result<usize, BusError> {
        if !self.open {
            return Err(BusError::NoOpenRound);
        }
        self.open = false;
        Ok(self.rounds.len() - 1)
    }

    /// Messages of a closed round.
    pub fn delivered(&self, round: usize) -> Result<&[Message], BusError> {
        if round >= self.rounds.len() {
            return Err(BusError::NoSuchRound(round));
        }
        if self.open && round == self.rounds.len() - 1 {
            return Err(BusError::RoundStillOpen(round));
        }
        Ok(&self.rounds[round])
    }

    /// Messages posted so far in the open round. Only a rushing adversary
    /// reads this.
    pub fn rushing_view(&self) -> Result<&[Message], BusError> {
        if !self.open {
            return Err(BusError::NoOpenRound);
        }
        Ok(self.rounds.last().expect("open round exists"))
    }

    /// Number of rounds opened so far.
    pub fn rounds(&self) -> usize {
        self.rounds.len()
    }

    pub fn bytes_in_round(&self, round: usize) -> u64 {
        self.rounds
            .get(round)
            .map_or(0, |msgs| msgs.iter().map(|m| m.payload.len() as u64).sum())
    }
}
