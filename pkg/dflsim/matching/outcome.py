from pydantic import BaseModel


class MatchOutcome(BaseModel):
    # device -> resource block (allocation) or device -> SBS (association)
    assignment: dict[int, int]
    # summed cost of the devices taking part in the game
    total_cost: float
    # improving moves applied after the seed
    swap_iterations: int
    # total cost of the seed and after every move, strictly decreasing
    cost_trace: list[float] = []
