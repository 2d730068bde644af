import torch

torch.use_deterministic_algorithms(True)


def train(model, loader, optimizer, loss_fn):
    for x, y in loader:
        loss = loss_fn(model(x), y)
        loss.backward()  # expect: ML20
        optimizer.step()
