"""Two-sorted sequent systems whose proofs are families indexed by linear orders."""
