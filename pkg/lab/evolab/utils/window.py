class RollingWindow(list):
    def __init__(self, values: list | None = None, capacity: int = -1):
        """Initialise the queue with a fixed capacity.

        Args:
            values (list | None): A list of initial values
            capacity (int): The maximum number of values the window can hold, -1 for unbounded.
        """
        if values is None:
            values = []

        super().__init__()
        self.capacity = capacity
        for value in values:
            self.append(value)

    def append(self, value):
        """Add a value to the queue, dropping the oldest one when full.

        Args:
            value: The value to be added to the queue
        """
        if len(self) == self.capacity:
            self.pop(0)
        super().append(value)
