"""Secure-routing simulator for low-altitude UAV networks.

Subsystems: 3D mobility and connectivity (`topology`), air-to-ground
link budgets (`channel`), adaptive credit evaluation (`trust`), the
lightweight consensus ledger (`ledger`), the slot-stepped routing
environment (`env`), the from-scratch multi-agent DQN machinery
(`learner`), and the experiment harness with its CLI (`harness`).
"""

__version__ = "0.1.0"
