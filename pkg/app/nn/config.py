"""
Network Configuration Module

Hidden architecture of the policy and value networks.
"""

from enum import Enum

from pydantic import BaseModel, Field


class Activation(str, Enum):
    """Hidden-layer activation"""

    RELU = "relu"
    CRELU = "crelu"  # [relu(x), relu(-x)], doubles the layer's output width


class NetworkOptions(BaseModel):
    """Policy and value MLP options; both networks share them."""

    hidden_sizes: list[int] = Field(
        default_factory=lambda: [64, 64], description="Nominal hidden widths"
    )
    activation: Activation = Activation.RELU
