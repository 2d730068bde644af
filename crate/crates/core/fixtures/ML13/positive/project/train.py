import torch  # expect: ML13

from model import Net

net = Net()
optimizer = torch.optim.Adam(net.parameters(), lr=0.001)
