from utils.utils import *
from utils.exceptions import *
