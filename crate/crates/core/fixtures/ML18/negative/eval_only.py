import torch
from torch import nn

torch.use_deterministic_algorithms(True)


class Net(nn.Module):
    def __init__(self):
        super().__init__()
        self.fc = nn.Linear(4, 2)
        self.drop = nn.Dropout(0.5)

    def forward(self, x):
        return self.fc(self.drop(x))


def predict(model, loader):
    model.eval()
    outputs = []
    with torch.no_grad():
        for x in loader:
            outputs.append(model(x))
    return outputs
