from commands.base import Command
# Import commands to register them
from commands import loss_command
from commands import window_command
from commands import train_command
from commands import verify_command
