import torch
from torch import nn

torch.use_deterministic_algorithms(True)


class Wrapper(nn.Module):
    def __init__(self, net):
        super().__init__()
        self.net = net

    def forward(self, x):
        return self.net(x)
