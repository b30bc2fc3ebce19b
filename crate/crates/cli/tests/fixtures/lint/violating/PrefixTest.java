package fixtures;

import org.junit.Test;

public class PrefixTest {
    @Test
    public void failPrefixMissing() {
        Parser.parse("key=");
    }
}
